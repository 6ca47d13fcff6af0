"""Experiment, target and verification services."""

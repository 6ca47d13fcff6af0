"""Utility scripts shipped with plmc."""

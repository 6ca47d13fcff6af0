"""Shared vocabularies."""

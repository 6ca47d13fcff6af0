"""Errors, output writers and argument parsing helpers."""

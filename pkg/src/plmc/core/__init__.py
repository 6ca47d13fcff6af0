"""Targets, exact kernel blocks, random streams and the batch noise bridge."""

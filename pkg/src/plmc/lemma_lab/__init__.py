"""Numerical certificates of the one-dimensional Gaussian perturbation bounds."""

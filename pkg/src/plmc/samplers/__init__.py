"""Langevin discretizations: Euler and Poisson-midpoint, overdamped and underdamped."""

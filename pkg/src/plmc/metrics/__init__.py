"""Moment tracking, Wasserstein-2 estimators and log-log curve fits."""

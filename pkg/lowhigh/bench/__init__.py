"""Workload generation, verified replay and CSV reporting for the
insertion algorithms."""

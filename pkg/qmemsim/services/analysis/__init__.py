"""Reduction of simulation output to hysteresis, stationary and regime diagnostics."""

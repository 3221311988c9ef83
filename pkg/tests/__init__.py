"""Test package for qmemsim."""

"""Test package for usher-lab."""

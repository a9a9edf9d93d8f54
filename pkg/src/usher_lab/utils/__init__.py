"""Utility helpers shared by the usher-lab commands."""

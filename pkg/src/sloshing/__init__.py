"""Spectral sloshing modes and boundary control."""

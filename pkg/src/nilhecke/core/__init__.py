"""Core pipeline API for nilhecke."""

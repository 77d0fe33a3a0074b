"""Unit tests for projective."""

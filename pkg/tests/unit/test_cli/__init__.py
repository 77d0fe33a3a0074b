"""Unit tests for cli."""

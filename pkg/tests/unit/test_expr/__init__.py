"""Unit tests for expr."""

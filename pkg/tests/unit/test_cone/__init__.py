"""Unit tests for cone."""

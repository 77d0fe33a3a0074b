"""Unit tests for measure."""

"""Unit tests for support."""

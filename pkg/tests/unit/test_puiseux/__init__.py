"""Unit tests for puiseux."""

"""Unit tests for classify."""

"""Unit tests for Virtual Developer Agent."""

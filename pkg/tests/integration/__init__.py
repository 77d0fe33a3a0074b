"""Integration tests for Virtual Developer Agent."""

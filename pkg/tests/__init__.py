"""Tests for Virtual Developer Agent."""

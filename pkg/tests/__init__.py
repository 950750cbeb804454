"""Tests for pisudoku."""

"""Tests for nilsub."""

"""Test suite for disco_index."""

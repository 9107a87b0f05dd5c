"""Test suite for the cayleylab package."""

"""Tests for povmforge."""

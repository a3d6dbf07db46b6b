"""Test the The Keys integration."""

"""Integrations with third-party tools."""

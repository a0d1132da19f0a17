"""Unit test package for dg_resolver."""

"""
Keeps the top-level modules importable from tests/
"""

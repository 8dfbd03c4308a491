"""Reduction compiler: integer sentences to polynomial systems over the function field."""

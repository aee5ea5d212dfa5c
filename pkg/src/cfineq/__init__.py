"""Refined Cartwright-Field inequalities: scalar, summation, divisor and operator forms."""

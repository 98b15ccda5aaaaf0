"""Binomial congruences, toral components and hypergeometric polynomial solutions."""

"""Superspecial genus-2 curves with Klein-four reduced automorphisms,
supersingular Legendre curves and class numbers over small primes."""

__version__ = "0.1.0"

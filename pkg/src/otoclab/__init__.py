"""OTOC relaxation in the quantum standard map and Perron-Frobenius resonances of the classical map."""

__version__ = "0.1.0"

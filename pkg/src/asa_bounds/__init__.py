"""Bornes d'approximation forte approchée (ASA) : cohomologie finie, densités, catalogue de groupes."""

__version__ = "0.1.0"

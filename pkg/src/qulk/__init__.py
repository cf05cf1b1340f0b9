"""Minimalist derivations of Yemeni Ibbi Arabic qulk-clauses."""
from .grammar import derive_clause, load_fragment, yia_fragment, yia_lexicon

__all__ = ["derive_clause", "load_fragment", "yia_fragment", "yia_lexicon"]

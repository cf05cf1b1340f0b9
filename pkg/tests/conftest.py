import pytest

from qulk.grammar import derive_clause, yia_fragment


@pytest.fixture(scope="session")
def fragment():
    return yia_fragment()


@pytest.fixture(scope="session")
def lexicon(fragment):
    return fragment.lexicon


@pytest.fixture(scope="session")
def derive(fragment):
    """derive(clause_type, **fillers) on the shipped fragment."""
    def run(clause_type, **fillers):
        return derive_clause(fragment, clause_type, fillers)
    return run

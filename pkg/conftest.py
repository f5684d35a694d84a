from pytest_factoryboy import register

from catalog.tests.factories import AutomatonFactory, BundledAutomatonFactory

register(AutomatonFactory, "identity_automaton")
register(BundledAutomatonFactory, "bundled_automaton")

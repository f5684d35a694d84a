from django.apps import AppConfig


class AutomataConfig(AppConfig):
    name = "automata"

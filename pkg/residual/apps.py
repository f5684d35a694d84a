from django.apps import AppConfig


class ResidualConfig(AppConfig):
    name = "residual"

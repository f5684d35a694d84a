from django.apps import AppConfig


class CosetsConfig(AppConfig):
    name = "cosets"

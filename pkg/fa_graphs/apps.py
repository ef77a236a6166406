from django.apps import AppConfig


class FaGraphsConfig(AppConfig):
    """
    Config object for this app.
    """

    name = "fa_graphs"
    verbose_name = "FA-module graph complexes"

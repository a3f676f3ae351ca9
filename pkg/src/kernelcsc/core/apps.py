from django.apps import AppConfig


class CoreConfig(AppConfig):
    name = "kernelcsc.core"
    verbose_name = "Constraint satisfaction clustering"

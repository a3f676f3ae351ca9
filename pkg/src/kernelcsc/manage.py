#!/usr/bin/env python
"""Command-line utility for kernelcsc experiments."""
import os
import sys

# Subcommand spellings accepted on the command line that differ from
# the management command module names.
COMMAND_ALIASES = {
    "build-bank": "build_bank",
}


def main():
    """Run experiment commands."""
    os.environ.setdefault(
        "DJANGO_SETTINGS_MODULE", "kernelcsc.settings.default"
    )
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(sys.argv)
    if len(argv) > 1:
        argv[1] = COMMAND_ALIASES.get(argv[1], argv[1])
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()

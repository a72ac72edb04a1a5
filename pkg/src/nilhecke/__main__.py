"""Entry point for running nilhecke as a module."""

from nilhecke.main import app


if __name__ == "__main__":
    app()

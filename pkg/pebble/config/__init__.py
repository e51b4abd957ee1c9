"""Configuration settings read once from the environment."""

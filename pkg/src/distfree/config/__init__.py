"""Configuration: process settings and run configuration files."""

from distfree.config.settings import Settings, get_settings
from distfree.config.runconfig import GridSection, NoiseSection, RunConfig, RunSection

__all__ = ["Settings", "get_settings", "RunConfig", "NoiseSection", "GridSection", "RunSection"]

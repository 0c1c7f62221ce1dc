import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import src.config as config


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts from the default settings"""
    config._settings = config.Settings()
    yield
    config._settings = config.Settings()

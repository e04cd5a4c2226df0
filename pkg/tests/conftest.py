import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

# numba compiles on first call; keep hypothesis from timing that
settings.register_profile("kuostab", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kuostab")

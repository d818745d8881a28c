from cqed_tempo.tests.fixtures_physics import *  # noqa

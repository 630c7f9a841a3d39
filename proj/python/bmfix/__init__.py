"""Fixed points of set-valued quasi-contractions on b-metric spaces."""

from ._bmfix import *  # noqa: F401,F403
from ._bmfix import __doc__  # noqa: F401

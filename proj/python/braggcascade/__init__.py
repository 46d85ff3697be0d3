from ._braggcascade import *  # noqa: F401,F403
from ._braggcascade import __doc__  # noqa: F401

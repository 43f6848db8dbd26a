"""Kernel SVM and logistic regression for small-image binary classification."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

from . import dictionary, logistic, quadratic, twolayer  # noqa: F401

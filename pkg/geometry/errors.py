#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Exceptions raised by the geometry, energy and optimization layers."""


class WinterbottomError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteInput(WinterbottomError, ValueError):
    """A direction or point with NaN/inf components was passed in."""


class NotDifferentiable(WinterbottomError):
    """The anisotropy has no gradient at the requested direction."""


class NonCoercive(WinterbottomError):
    """A shifted anisotropy lost its positive lower bound (x0 outside int W)."""


class RegimeError(WinterbottomError):
    """The adhesion coefficient lies outside the regime an operation needs."""


class Unbounded(WinterbottomError):
    """A halfspace intersection is not bounded."""


class NumericalDegeneracy(WinterbottomError):
    """Hull or polygon computations collapsed (flat hull, self-intersection)."""


class InvalidShape(WinterbottomError, ValueError):
    """A shape violates the substrate, simplicity or connectivity rules."""


class OracleTooLarge(WinterbottomError, ValueError):
    """Exhaustive enumeration was requested for too many cells."""


class ConfigError(WinterbottomError, ValueError):
    """A run configuration or anisotropy description could not be parsed."""


class CompleteWetting(RegimeError):
    """lambda <= -phi(e_d): the energy is unbounded below and no minimizer exists."""

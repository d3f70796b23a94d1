#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Geometry module initialization."""

from geometry.errors import *
from geometry.anisotropy import *
from geometry.convex_geometry import *

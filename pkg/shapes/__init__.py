#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Shapes module initialization."""

from shapes.shapes_energy import *
from shapes.pixel_shapes import *

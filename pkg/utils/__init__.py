#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Utilities module initialization."""

from utils.io_utils import *
from utils.raster_utils import *
from utils.schemas import *

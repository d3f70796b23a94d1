#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Optimization module initialization."""

from optimization.stability import *
from optimization.oracle import *
from optimization.optimizer import *

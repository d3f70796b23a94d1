#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Run archive package."""

from database.database import * 
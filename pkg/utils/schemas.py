#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Validated forms of the anisotropy and run-config JSON documents."""

import json
import logging
import os
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from geometry.anisotropy import Anisotropy, make_phi_lambda, make_phi_shifted
from geometry.errors import ConfigError, WinterbottomError

logger = logging.getLogger(__name__)


class AnisotropySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["pnorm", "weighted", "support", "crystalline"]
    p: Optional[Union[float, Literal["inf"]]] = None
    dim: Optional[int] = Field(default=None, ge=2, le=3)
    A: Optional[List[List[float]]] = None
    vertices: Optional[List[List[float]]] = None
    w: Optional[List[List[float]]] = None
    lambda_mod: Optional[float] = None
    shift: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_kind_fields(self):
        required = {"pnorm": "p", "weighted": "A", "support": "vertices", "crystalline": "w"}[self.kind]
        if getattr(self, required) is None:
            raise ValueError(f"{self.kind} anisotropy needs the '{required}' field")
        return self

    def build(self):
        """The Anisotropy described, shift applied before the lambda modification."""
        if self.kind == "pnorm":
            phi = Anisotropy.pnorm(float("inf") if self.p == "inf" else self.p, self.dim or 2)
        elif self.kind == "weighted":
            phi = Anisotropy.weighted(self.A)
        elif self.kind == "support":
            phi = Anisotropy.support(self.vertices)
        else:
            phi = Anisotropy.crystalline(self.w)
        if self.dim is not None and phi.dim != self.dim:
            raise ConfigError(f"{self.kind} anisotropy is {phi.dim}-dimensional but dim={self.dim}")
        if self.shift is not None:
            if len(self.shift) != phi.dim:
                raise ConfigError(f"shift has {len(self.shift)} components, expected {phi.dim}")
            phi = make_phi_shifted(phi, self.shift)
        if self.lambda_mod is not None:
            phi = make_phi_lambda(phi, self.lambda_mod)
        return phi


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    phi: AnisotropySpec
    lambda_: float = Field(alias="lambda")
    volume: float = Field(default=1.0, gt=0)
    nvertices: int = Field(default=64, ge=8)
    trials: int = Field(default=5, ge=1)
    seed: int = 7


def _shorthand(text, dim):
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "pnorm":
        p = arg.strip().lower() or "2"
        return {"kind": "pnorm", "p": "inf" if p in ("inf", "infinity") else float(p), "dim": dim or 2}
    key = {"weighted": "A", "support": "vertices", "crystalline": "w"}.get(kind)
    if key is None:
        raise ConfigError(f"Unknown anisotropy kind {kind!r}")
    return {"kind": kind, key: json.loads(arg)}


def parse_phi(text, dim=None):
    """
    Anisotropy from a --phi value: a JSON file, a JSON object or a shorthand
    such as ``pnorm:2`` or ``weighted:[[2,0],[0,1]]``.

    Raises:
        ConfigError: on malformed input, a dimension mismatch or a density
        that cannot be built
    """
    try:
        if os.path.isfile(text):
            with open(text, "r", encoding="utf-8") as f:
                data = json.load(f)
        elif text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            data = _shorthand(text, dim)
        if dim is not None and data.get("dim") is None:
            data = {**data, "dim": dim}
        return AnisotropySpec.model_validate(data).build()
    except ConfigError:
        raise
    except (ValidationError, ValueError, TypeError, WinterbottomError) as e:
        raise ConfigError(f"Invalid anisotropy {text!r}: {e}") from e


def load_run_config(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return RunConfig.model_validate(json.load(f))
    except (OSError, ValidationError, ValueError) as e:
        raise ConfigError(f"Invalid run config {path}: {e}") from e

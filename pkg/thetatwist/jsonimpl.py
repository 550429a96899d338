# -*- coding: utf-8 -*-
"""
    thetatwist.jsonimpl
    ~~~~~~~~~~~~~~~~~~~

    JSON serializer implementation wrapper.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""

import json

import numpy as np

if False:
    # For type annotation
    from typing import Any, IO  # NOQA


class ReportJSONEncoder(json.JSONEncoder):
    """JSONEncoder subclass that flattens numpy values and complex numbers."""

    def default(self, obj):
        # type: (Any) -> Any
        if isinstance(obj, (complex, np.complexfloating)):
            return {"re": float(obj.real), "im": float(obj.imag)}
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, (np.floating, np.bool_)):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if hasattr(obj, "as_dict"):
            return obj.as_dict()
        return super().default(obj)


def _defaults(kwds):
    kwds["cls"] = ReportJSONEncoder
    kwds.setdefault("sort_keys", True)
    kwds.setdefault("indent", 2)


def dump(obj, fp, *args, **kwds):
    # type: (Any, IO, Any, Any) -> None
    _defaults(kwds)
    json.dump(obj, fp, *args, **kwds)


def dumps(obj, *args, **kwds):
    # type: (Any, Any, Any) -> str
    _defaults(kwds)
    return json.dumps(obj, *args, **kwds)


def load(*args, **kwds):
    # type: (Any, Any) -> Any
    return json.load(*args, **kwds)


def loads(*args, **kwds):
    # type: (Any, Any) -> Any
    return json.loads(*args, **kwds)

# -*- coding: utf-8 -*-
"""
    thetatwist.config
    ~~~~~~~~~~~~~~~~~

    Configuration values for the experiment harness.

    Values are registered with :func:`add_config_value`, read from a
    ``name = <python literal>`` file and overridden by command-line flags.
    :func:`ensure_configuration` runs once everything is merged.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import ast
import logging
import os

from .errors import ConfigError
from .ntheory import is_prime

logger = logging.getLogger("thetatwist")

__all__ = ["Config", "add_config_value", "read_config_file", "ensure_configuration"]

_registry = {}


def add_config_value(name, default, types=()):
    """
    Register a configuration value.

    :param name: Key used in files and as the attribute name.
    :param default: Value used when neither the file nor the CLI sets one.
    :param types: Accepted types; empty means the type of ``default``.
    """
    if not types and default is not None:
        types = (type(default),)
    _registry[name] = (default, tuple(types))


add_config_value("ell", 3)
add_config_value("p", 5)
add_config_value("char_index", 1)
add_config_value("weight", 12)
add_config_value("xmin", 2**10)
add_config_value("xmax", 2**14)
add_config_value("delta", 1.0, (int, float))
add_config_value("delta_policy", "fixed")
add_config_value("pq_policy", "optimal")
add_config_value("P", None, (int, float))
add_config_value("Q", None, (int, float))
add_config_value("level", "quick")
add_config_value("threads", 1)
add_config_value("out", None, (str,))
add_config_value("format", "csv")
add_config_value("cache_dir", None, (str,))
add_config_value("max_table", 400_000)

_choices = {
    "delta_policy": ("fixed", "optimal"),
    "pq_policy": ("optimal", "explicit"),
    "level": ("quick", "full"),
    "format": ("csv", "json"),
}


class Config:
    """Merged configuration; registered names are attributes."""

    def __init__(self, values=None):
        self._values = {name: default for name, (default, _) in _registry.items()}
        for name, value in (values or {}).items():
            self[name] = value

    def __getattr__(self, name):
        try:
            return self.__dict__["_values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def __getitem__(self, name):
        return self._values[name]

    def __setitem__(self, name, value):
        if name not in _registry:
            raise ConfigError("unknown configuration value %r" % name)
        _, types = _registry[name]
        if value is not None and types:
            if isinstance(value, bool) or not isinstance(value, types):
                raise ConfigError(
                    "%s must be of type %s, got %r"
                    % (name, "/".join(t.__name__ for t in types), value)
                )
        self._values[name] = value

    def update(self, values):
        for name, value in values.items():
            if value is not None:
                self[name] = value
        return self

    def as_dict(self):
        return dict(sorted(self._values.items()))

    def __repr__(self):
        return "<Config: %s>" % ", ".join("%s=%r" % kv for kv in self.as_dict().items())


def read_config_file(path):
    """
    Parse a ``name = <python literal>`` file.

    Blank lines and ``#`` comments are skipped. A missing file gives an empty
    mapping.

    :raises ConfigError: on a malformed line or an unknown key.
    """
    if path is None or not os.path.exists(path):
        if path is not None:
            logger.info("[thetatwist] config file %s not found, using defaults", path)
        return {}
    values = {}
    with open(path, encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, literal = line.partition("=")
            name = name.strip()
            if not sep or not name:
                raise ConfigError("%s:%d: expected 'name = value'" % (path, lineno))
            if name not in _registry:
                raise ConfigError("%s:%d: unknown key %r" % (path, lineno, name))
            try:
                values[name] = ast.literal_eval(literal.strip())
            except (ValueError, SyntaxError) as exc:
                raise ConfigError("%s:%d: bad value for %s: %s" % (path, lineno, name, exc))
    return values


def ensure_configuration(config):
    """
    Coerce incompatible combinations and validate the result.

    :raises ConfigError: if an invariant of the experiment grid fails.
    """
    if config.delta_policy == "optimal" and config.delta != 1.0:
        logger.info("[thetatwist] delta_policy='optimal', ignoring delta=%s.", config.delta)
        config["delta"] = 1.0
    if config.pq_policy == "optimal" and (config.P is not None or config.Q is not None):
        logger.info("[thetatwist] pq_policy='optimal', ignoring explicit P and Q.")
        config["P"] = None
        config["Q"] = None

    for name, allowed in _choices.items():
        if config[name] not in allowed:
            raise ConfigError("%s must be one of %s, got %r" % (name, allowed, config[name]))
    if config.pq_policy == "explicit" and (config.P is None or config.Q is None):
        raise ConfigError("pq_policy='explicit' needs both P and Q")
    if config.weight != 12:
        raise ConfigError("only weight 12 is supported, got %r" % config.weight)
    if config.ell < 1:
        raise ConfigError("ell must be positive, got %r" % config.ell)
    if config.p < 3 or not is_prime(config.p):
        raise ConfigError("p must be an odd prime, got %r" % config.p)
    if not 0 <= config.char_index < config.p - 1:
        raise ConfigError(
            "char_index must lie in [0, %d), got %r" % (config.p - 1, config.char_index)
        )
    if not config.xmin < config.xmax:
        raise ConfigError("xmin=%r must be below xmax=%r" % (config.xmin, config.xmax))
    if config.p >= config.xmin:
        raise ConfigError("p=%r must be below xmin=%r" % (config.p, config.xmin))
    if config.delta < 1:
        raise ConfigError("delta must be at least 1, got %r" % config.delta)
    if config.threads < 1:
        raise ConfigError("threads must be positive, got %r" % config.threads)
    return config

# treespace/errors.py

import logging

logger = logging.getLogger("treespace.verify")


class TreespaceError(ValueError):
    exit_code = 1
    status_code = 400


class MalformedInputError(TreespaceError):
    """Input that cannot be parsed or names something that does not exist."""

    exit_code = 1
    status_code = 400


class PreconditionError(TreespaceError):
    """Well-formed input that violates an operation's preconditions."""

    exit_code = 2
    status_code = 422


class CertificateError(TreespaceError):
    """An independent recheck disagreed with a construction."""

    exit_code = 3
    status_code = 500


def certify(condition: bool, message: str) -> None:
    if not condition:
        logger.error("certificate check failed: %s", message)
        raise CertificateError(message)

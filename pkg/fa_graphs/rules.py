import rules

from .conf import get_setting


@rules.predicate
def is_stale_entry(user, obj):
    """
    Returns true if the cache entry was computed by another code version.
    """

    if obj is None:
        return False
    return obj.code_version != str(get_setting("CODE_VERSION"))


@rules.predicate
def is_valid_user(user, obj):  # pragma: nocover
    """
    Convenience method to confirm if they are an authenticated user.
    """

    return rules.is_authenticated(user)

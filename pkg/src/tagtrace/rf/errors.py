"""RF simulation exception hierarchy."""


class RfError(Exception):
    """Base for air-interface simulation failures."""


class TagNotFound(RfError):
    """Tag absent from the field or outside the usable range."""


class BlockOutOfRange(RfError):
    """Requested block span exceeds the tag's memory."""


class BlockLocked(RfError):
    """Write refused because a target block is locked."""


class DuplicateUid(RfError):
    """A uid already exists in the simulation world."""


class WorldFileError(RfError):
    """World description file could not be parsed."""

class FormatError(ValueError):
    """Malformed or unsupported binary data (images, trees, model files).

    ``offset`` is the byte position the problem was detected at, when known;
    it is also appended to the message.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset

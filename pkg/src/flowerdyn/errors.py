class InternalConsistencyError(RuntimeError):
    """A computation contradicted a proved structural property.

    Raised with the exact witnesses attached, never for bad user input
    (those raise ``ValueError``).
    """

    def __init__(self, message: str, witnesses: dict | None = None):
        super().__init__(message)
        self.witnesses = dict(witnesses or {})

class ValidationError(ValueError):
    """Input data failed validation. ``problems`` lists every offence found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))

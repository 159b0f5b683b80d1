class ExtractError(Exception):
    pass


class UndecodableImage(ExtractError):
    def __init__(self, path):
        super().__init__(f"cannot decode image: {path}")
        self.path = str(path)


class HeadMismatch(ExtractError):
    def __init__(self, head_classes: int, folder_classes: int):
        super().__init__(
            f"checkpoint head has {head_classes} classes, image folder has {folder_classes}")

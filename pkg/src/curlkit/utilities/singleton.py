class Singleton(type):
    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super(Singleton, cls).__call__(*args, **kwargs)
        return cls._instances[cls]

    def reset(cls):
        """Forget the shared instance, the next call builds a fresh one."""
        instance = cls._instances.pop(cls, None)
        if instance is not None and hasattr(instance, "close"):
            instance.close()

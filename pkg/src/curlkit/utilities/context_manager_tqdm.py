import sys

from tqdm import tqdm


# print statements inside a tracked step are rerouted through tqdm.write so that
# they do not tear the progress bar apart
class TqdmFile:
    def __init__(self, file):
        self.file = file

    def write(self, x):
        # print() emits the trailing newline as a second call
        if len(x.rstrip()) > 0:
            tqdm.write(x.rstrip("\n"), file=self.file)

    def flush(self) -> None:
        pass


class Nostdout:
    def __init__(self, file=None):
        self.file = file

    def __enter__(self):
        self.save_stdout = sys.stdout
        sys.stdout = TqdmFile(self.file if self.file is not None else sys.stderr)
        return self

    def __exit__(self, *args, **kwargs):
        sys.stdout = self.save_stdout

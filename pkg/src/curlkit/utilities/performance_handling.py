import functools
import os
import sys
import time
from datetime import datetime, timezone
from typing import Optional

import pandas as pd
from tqdm import tqdm

from .singleton import Singleton
from .context_manager_tqdm import Nostdout
from .configuration import Configuration


class Performance(metaclass=Singleton):
    def __init__(self, perf_path: Optional[str] = None, write_console: bool = False, total: Optional[int] = None):
        self.start = time.time()
        self.last = self.start
        self.perf = pd.DataFrame(columns=["name", "start", "end", "duration"])
        self.path = perf_path
        self.count = 0
        # the bar lives on stderr, stdout carries the reports
        self.pbar = tqdm(file=sys.stderr, total=total, disable=not write_console)
        self.status = "Waiting on request"
        self.total = None
        self.write_console = write_console
        self.warnings = []

    @staticmethod
    def string_time(epoch_time):
        return datetime.fromtimestamp(epoch_time, tz=timezone.utc).strftime("%H:%M:%S")

    def _record(self, log_message: str, begin: float, end: float):
        row = pd.DataFrame.from_records([
            {
                "name": log_message,
                "start": self.string_time(begin),
                "end": self.string_time(end),
                "duration": (end - begin)
            }])
        self.perf = row if self.perf.empty else pd.concat([self.perf, row], ignore_index=True)
        self.status = f"{log_message}: took {round(end - begin, 2)} seconds"
        self.pbar.set_postfix_str(self.status)
        self.last = end
        self.count += 1
        self.pbar.update(1)

    def finished_step(self, log_message: str):
        self._record(log_message, self.last, time.time())

    def warn(self, message: str):
        """Keep the message with the run and print it on stderr above the bar."""
        self.warnings.append(message)
        tqdm.write(f"Warning: {message}", file=sys.stderr)

    @staticmethod
    def track(argument: str = None):
        def performance_tracker_wrapper(func):
            @functools.wraps(func)
            def wrapper(self, *args, **kwargs):
                perf = Performance()
                begin = time.time()
                with Nostdout():
                    result = func(self, *args, **kwargs)
                if argument is None or argument not in kwargs:
                    log_message = func.__name__
                else:
                    log_message = f"{func.__name__} for {kwargs[argument]}"
                perf._record(log_message, begin, time.time())
                return result

            return wrapper

        return performance_tracker_wrapper

    def finish(self):
        end = time.time()
        row = pd.DataFrame.from_records([
            {
                "name": "total",
                "start": self.string_time(self.start),
                "end": self.string_time(end),
                "duration": (end - self.start)
            }])
        self.perf = row if self.perf.empty else pd.concat([self.perf, row], ignore_index=True)
        self.total = round(end - self.start, 2)
        if self.write_console:
            with Nostdout():
                print(f"{self.count} steps, total: took {self.total} seconds")
        self.pbar.set_postfix_str("Completed")
        self.close()

    def close(self):
        self.pbar.close()

    def save(self):
        if self.path is not None:
            directory = os.path.dirname(self.path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self.perf.to_csv(self.path, sep=";", decimal=",", index=False)

    @staticmethod
    def set_up_performance_with_path(path, write_console: bool = False):
        Performance.reset()
        return Performance(perf_path=path, write_console=write_console)

    @staticmethod
    def set_up_performance(config: Configuration):
        return Performance.set_up_performance_with_path(path=config.perf_path, write_console=config.verbose)

    def finish_and_save(self):
        self.finish()
        self.save()

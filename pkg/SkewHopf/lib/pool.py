'''how this works:
Every job named in jobs/config.py is run (at most) 'iterations' times, defaults to 1.
Every name must correspond to a file in the jobs folder of the format 'job_*.py'.
If the job module has no 'run_query', 'execute_job' is called with 'args' and that's it.
Otherwise 'run_query' is called with 'args', its result is split into
'async_cores' chunks (when 'run_async' is set), 'execute_job' runs on every chunk
in its own process, and 'summarize_results' receives the list of chunk results.
Setting 'EXECUTE_NEEDS_ARGS' in the module passes 'args' to 'execute_job' too.

map_chunks is the lightweight variant used inside the library: it fans a pure
function out over chunks and returns the results in chunk order.
'''
from __future__ import annotations
from dataclasses import dataclass
from importlib import import_module
from math import ceil
from multiprocessing import Manager, Pipe, Process
from os import cpu_count, getpid
from queue import Queue
from time import sleep, time
from traceback import format_exc
from typing import Any, Callable, Dict, List, Tuple
from types import ModuleType
from SkewHopf.lib.logger import configure_logger, print_logger, LOGGER_NAME
import logging

@dataclass
class Message:
    module_id: str
    parameters: list

    @staticmethod
    def get_done_message() -> Message:
        return Message(None, None)

    @staticmethod
    def get_execution_message(module_id: str, parameters: list) -> Message:
        return Message(module_id, parameters)

    @property
    def is_done_message(self: Message):
        return self.module_id is None

def _import(module_id):
    return import_module(module_id[module_id.index('@')+1:])

def split_parameters(parameters: list, pool_size: int) -> List[list]:
    '''
    contiguous, order-preserving chunks; some may be empty when there are fewer items than workers.
    '''
    size = max(ceil(len(parameters) / max(pool_size, 1)), 1)
    chunks = [parameters[k:k + size] for k in range(0, len(parameters), size)]
    return chunks + [[] for _ in range(pool_size - len(chunks))]

def _run_chunk(func, index, chunk, result_queue):
    try:
        result_queue.put((index, func(chunk), None))
    except Exception:
        result_queue.put((index, None, format_exc()))

def map_chunks(func: Callable[[list], Any], items: list, cores: int = 0) -> List[Any]:
    '''
    runs func on order-preserving chunks of items in separate processes.
    func must be a picklable top-level function. results come back in chunk order.
    '''
    cores = cores if cores > 0 else cpu_count()
    chunks = [c for c in split_parameters(items, cores) if c]
    if len(chunks) <= 1:
        return [func(c) for c in chunks]
    with Manager() as manager:
        result_queue = manager.Queue()
        processes = [Process(target=_run_chunk, args=(func, i, c, result_queue)) for i, c in enumerate(chunks)]
        for p in processes:
            p.start()
        results = dict()
        for _ in chunks:
            index, result, error = result_queue.get()
            if error:
                raise RuntimeError(f'worker for chunk {index} failed:\n{error}')
            results[index] = result
        for p in processes:
            p.join()
    return [results[i] for i in range(len(chunks))]

class WorkerPool:
    manager: Manager
    job_queue: Queue
    result_queues: Dict[str, Queue]

    def __init__(self: WorkerPool) -> None:
        self.manager = Manager()
        self.job_queue = self.manager.Queue()
        self.log_queue = self.manager.Queue()
        self.result_queues = {}

    def start(self: WorkerPool, modules: List[Tuple[str, Dict[str, Any]]]): # -> list of (module_id, timings)
        log_printer = Process(target=print_logger, args=(self.log_queue,))
        log_printer.start()
        pipes = []
        for i, (module_path, module_config) in enumerate(modules):
            module_id = f'{i}@{module_path}'
            self.result_queues[module_id] = self.manager.Queue()
            out_pipe, in_pipe = Pipe()
            Process(
                target=WorkerPool.run_job,
                args=(self.job_queue, self.log_queue, self.result_queues[module_id], module_id, module_config, in_pipe)
            ).start()
            pipes += [out_pipe]

        jobs_left = len(modules)
        while jobs_left != 0:
            while self.job_queue.empty():
                sleep(0.5)
            message = self.job_queue.get()
            if message.is_done_message:
                jobs_left -= 1
                continue
            Process(
                target=WorkerPool.run_sub_job,
                args=(message.module_id, message.parameters, self.log_queue, self.result_queues[message.module_id])
            ).start()

        results = [p.recv() for p in pipes]
        self.log_queue.put(None)
        log_printer.join()
        return results

    @staticmethod
    def run_module(module: ModuleType, module_id: str, job_queue: Queue, result_queue: Queue, run_async: bool, async_cores: int, args: Dict[str, Any]) -> bool:
        try:
            if not hasattr(module, 'run_query'):
                module.execute_job(**args)
                return True
            queried_data = module.run_query(**args)
            extra_args = getattr(module, 'EXECUTE_NEEDS_ARGS', False)
            if not run_async:
                results = [module.execute_job(queried_data, **args) if extra_args else module.execute_job(queried_data)]
            else:
                async_cores = async_cores if async_cores != 0 else cpu_count()
                for queried_chunk in split_parameters(queried_data, async_cores):
                    job_queue.put(Message.get_execution_message(module_id, (queried_chunk, args) if extra_args else (queried_chunk,)))
                results = [result_queue.get() for _ in range(async_cores)]
            return module.summarize_results(results)
        except:
            logging.getLogger(LOGGER_NAME).error(f'Error in module {module_id}: {format_exc()}')
            return False

    @staticmethod
    def run_job(job_queue, log_queue, result_queue, module_id, module_config, in_pipe) -> None:
        try:
            configure_logger(f'query_{getpid()}', log_queue)
            module = _import(module_id)
            args = module_config.get('args', {})
            timings, verdicts = [], []
            for _ in range(module_config.get('iterations', 1)):
                start_time = time()
                verdicts.append(WorkerPool.run_module(module, module_id, job_queue, result_queue,
                                                      module_config.get('run_async', False), module_config.get('async_cores', 0), args))
                timings.append(time() - start_time)
            job_queue.put(Message.get_done_message())
            in_pipe.send((module_id, timings, all(verdicts)))
        except:
            logging.getLogger(LOGGER_NAME).error(f'Error in job {module_id}: {format_exc()}')
            job_queue.put(Message.get_done_message())
            in_pipe.send((module_id, [], False))

    @staticmethod
    def run_sub_job(module_id, parameters, log_queue, result_queue):
        configure_logger(f'execute_{getpid()}', log_queue)
        module = _import(module_id)
        try:
            if getattr(module, 'EXECUTE_NEEDS_ARGS', False):
                result = module.execute_job(parameters[0], **parameters[1])
            else:
                result = module.execute_job(parameters[0])
        except:
            logging.getLogger(LOGGER_NAME).error(f'Error in sub job of {module_id}: {format_exc()}')
            result = None
        result_queue.put(result)

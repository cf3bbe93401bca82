"""EDF-family scheduling of periodic tasks on uniform multiprocessors."""

from .feasibility import (FeasibilitySplit, admit, density, edf_schedulable_constrained,
                          edf_schedulable_implicit, laxity, schedulable, split_by_feasibility,
                          utilization)
from .model import (Job, JobState, Machine, TaskSpec, UnsupportedInputError, as_rational,
                    format_rational, hyperperiod, release_job, work_done)
from .queues import DeadlineClassQueueSet, EmptyQueueError, HeapQueue
from .schedulers import (Partition, ScheduleDecision, efdf_assign, global_edf_assign,
                         partition_first_fit, partitioned_assign)
from .sim import SimReport, compare, simulate

__version__ = "0.1.0"

"""Integer codes shared by the event-loop kernels and their wrapper."""

# Policy bases (ps is handled by the dedicated sharing kernel).
FCFS, LCFS, RANDOM, SJF, LCFS_P, SJF_P, SRPT, ADE, ADS, ADM = range(10)

BASE_CODE = {
    "fcfs": FCFS, "lcfs": LCFS, "random": RANDOM, "sjf": SJF,
    "lcfs_p": LCFS_P, "sjf_p": SJF_P, "srpt": SRPT,
    "ade": ADE, "ads": ADS, "adm": ADM,
}

# Decision-log actions.
START, PREEMPT, RESUME, DELIVER, DISCARD = range(5)
ACTION_NAME = ("start", "preempt", "resume", "deliver", "discard")

# Update lifecycle.
NOT_ARRIVED, WAITING, IN_SERVICE, DELIVERED, DISCARDED = -1, 0, 1, 2, 3

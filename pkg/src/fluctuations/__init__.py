# Inner fluctuations module

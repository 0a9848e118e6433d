import os

# run the CLI dispatcher in-process unless a test asks otherwise
os.environ.setdefault("CHAUNDY_WORKERS", "1")

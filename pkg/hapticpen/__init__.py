from hapticpen.client import StylusClient, DeviceStatus
from hapticpen.options import HarnessOptions

VERSION = (0, 1, 0)
VERSION_STRING = '.'.join(str(i) for i in VERSION)

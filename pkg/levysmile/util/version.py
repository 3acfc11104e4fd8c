LEVYSMILE_VERSION = "0.1.0"


def get_version():
    return LEVYSMILE_VERSION

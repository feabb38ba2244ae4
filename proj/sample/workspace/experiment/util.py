"""String helpers used by the sample workspace."""


def shout(text):
    return text.upper()


def repeat(text, times):
    if times <= 0:
        return ""
    return text * times


def initials(name):
    parts = [p for p in name.split() if p]
    caps = []
    for part in parts:
        caps.append(part[0].upper())
    return "".join(caps)

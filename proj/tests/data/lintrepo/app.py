# usr_id of the caller comes from the session cache
uid = 4

def getUid(session):
    """Return the uid for a session."""
    return session.uid

"""
fockgate unittests
==================

"""

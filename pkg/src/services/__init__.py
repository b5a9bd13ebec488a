"""
Services package initialization
""" 